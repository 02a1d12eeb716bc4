# Generated by Django 4.2.7 on 2026-10-16 09:12

from django.db import migrations, models
import django.db.models.deletion
import uuid


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='CertificationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('run_id', models.UUIDField(default=uuid.uuid4, unique=True)),
                ('command', models.CharField(max_length=32)),
                ('parameters', models.JSONField(default=dict)),
                ('method', models.CharField(blank=True, max_length=32)),
                ('lo_dyadic', models.TextField(blank=True)),
                ('hi_dyadic', models.TextField(blank=True)),
                ('lo_decimal', models.CharField(blank=True, max_length=64)),
                ('hi_decimal', models.CharField(blank=True, max_length=64)),
                ('conditional_on', models.CharField(blank=True, help_text='Comma-separated assumptions', max_length=200)),
                ('exit_code', models.IntegerField(default=0)),
                ('report', models.TextField(blank=True)),
                ('started_at', models.DateTimeField(auto_now_add=True)),
                ('duration_seconds', models.FloatField(blank=True, null=True)),
            ],
            options={
                'ordering': ['-started_at'],
            },
        ),
        migrations.CreateModel(
            name='RunTerm',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('position', models.IntegerField()),
                ('columns', models.JSONField(default=dict)),
                ('hi_dyadic', models.TextField()),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='terms', to='certify.certificationrun')),
            ],
            options={
                'ordering': ['position'],
            },
        ),
    ]
