from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='AnalysisRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command_name', models.CharField(help_text='Name of the analysis command', max_length=255)),
                ('executed_at', models.DateTimeField(auto_now_add=True, help_text='Timestamp when the analysis was run')),
                ('success', models.BooleanField(default=True, help_text='Whether the analysis ran to completion')),
                ('parameters', models.JSONField(blank=True, help_text='Command parameters as JSON', null=True)),
                ('holds', models.BooleanField(blank=True, help_text='Verdict of the analysis, if it has one', null=True)),
                ('exit_code', models.PositiveSmallIntegerField(default=0, help_text='Process exit code: 0 holds, 1 fails, 2 error')),
                ('output', models.TextField(blank=True, default='', help_text='Report written to stdout')),
                ('error_message', models.TextField(blank=True, default='', help_text='Error message if the analysis failed')),
                ('duration', models.FloatField(blank=True, help_text='How long the analysis took (in seconds)', null=True)),
            ],
            options={
                'verbose_name': 'Analysis Run',
                'verbose_name_plural': 'Analysis Runs',
                'ordering': ['-executed_at'],
            },
        ),
    ]
